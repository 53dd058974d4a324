import itertools
import unittest
from maxcut_game.core.equilibrium import (
    AbsenceRecord,
    AuditPreconditionError,
    CertificatePool,
    DeviationCertificate,
    DeviationSearch,
    PruningLevel,
    audit_minimal_deviation,
    best_response,
    find_strong_deviation,
    is_minimal,
    is_nash,
    is_q_se,
    iter_strong_deviations,
    verify_certificate,
)
from maxcut_game.core.fixtures import (
    complete_graph,
    double_swap_gadget,
    figure1_graph,
    figure1_sigma,
    path_graph,
    swap_gadget,
)
from maxcut_game.core.game import Coloring, canonical_colorings, payoffs
from maxcut_game.core.graph import Graph, graph_atlas
from maxcut_game.core.solver import enumerate_optimal


def brute_force_deviates(g, sigma, q):
    """True iff some coalition of size <= q has a recolouring where every member gains."""
    before = payoffs(g, sigma)
    for size in range(1, q + 1):
        for members in itertools.combinations(range(g.n), size):
            choices = [[a for a in range(1, sigma.k + 1) if a != sigma[v]] for v in members]
            for colors in itertools.product(*choices):
                after = payoffs(g, sigma.replace(dict(zip(members, colors))))
                if all(after[v] > before[v] for v in members):
                    return True
    return False


class TestNash(unittest.TestCase):
    def test_best_response(self):
        """Test the best unilateral colour of v1 in the worked example."""
        g, sigma = figure1_graph(), figure1_sigma()
        self.assertEqual(best_response(g, sigma, 0), (3, 1))
        # v4 already has every neighbour in another colour
        self.assertEqual(best_response(g, sigma, 3), (2, 0))

    def test_is_nash(self):
        """Test the NE check and its witness."""
        g, sigma = figure1_graph(), figure1_sigma()
        self.assertEqual(is_nash(g, sigma), (False, (0, 3)))
        g, sigma = swap_gadget()
        self.assertEqual(is_nash(g, sigma), (True, None))

    def test_best_response_ties(self):
        """Test that ties go to the smallest colour."""
        g = path_graph(3)
        sigma = Coloring((1, 1, 2), 3)
        self.assertEqual(best_response(g, sigma, 1), (3, 1))
        self.assertEqual(best_response(g, Coloring((2, 1, 3), 3), 1), (1, 0))

    def test_optimum_is_nash(self):
        """Test that every optimal colouring is a NE."""
        for g in graph_atlas(4, 1):
            for sigma in enumerate_optimal(g, 3):
                with self.subTest(graph=g, sigma=sigma.colors):
                    self.assertTrue(is_nash(g, sigma)[0])


class TestStrongDeviation(unittest.TestCase):
    def setUp(self):
        self.g, self.sigma = swap_gadget()

    def test_swap_certificate(self):
        """Test the first certificate on the 4-cycle gadget."""
        cert = find_strong_deviation(self.g, self.sigma, 2)
        self.assertTrue(cert.found)
        self.assertEqual(cert.coalition, (0, 1))
        self.assertEqual(cert.target.colors, (2, 1, 2, 1))
        self.assertEqual(cert.gains, (1, 1))
        self.assertEqual(cert.delta_s, 2)
        self.assertTrue(cert.minimal)
        self.assertTrue(cert.sigma_is_nash)
        self.assertTrue(verify_certificate(self.g, self.sigma, cert))

    def test_absence(self):
        """Test the absence record when only single players are considered."""
        result = find_strong_deviation(self.g, self.sigma, 1)
        self.assertIsInstance(result, AbsenceRecord)
        self.assertFalse(result.found)
        self.assertEqual(result.q, 1)
        self.assertEqual(result.to_dict()["found"], False)
        self.assertTrue(is_q_se(self.g, self.sigma, 1))
        self.assertFalse(is_q_se(self.g, self.sigma, 2))

    def test_q_out_of_range(self):
        """Test that q must lie in 1..n."""
        with self.assertRaises(ValueError):
            find_strong_deviation(self.g, self.sigma, 0)
        with self.assertRaises(ValueError):
            find_strong_deviation(self.g, self.sigma, 5)

    def test_pruning_levels_agree_on_gadget(self):
        """Test that every pruning level finds the swap."""
        for level in PruningLevel:
            with self.subTest(level=level):
                cert = find_strong_deviation(self.g, self.sigma, 4, level)
                self.assertEqual(cert.coalition, (0, 1))
                self.assertEqual(cert.pruning, level)
                self.assertEqual(cert.minimal, True if level == PruningLevel.NONE else None)

    def test_non_nash_gives_single_player(self):
        """Test that a profitable unilateral move is found as a size-1 deviation."""
        cert = find_strong_deviation(figure1_graph(), figure1_sigma(), 3)
        self.assertEqual(cert.coalition, (0,))
        self.assertEqual(cert.target[0], 3)
        self.assertEqual(cert.gains, (1,))

    def test_certificate_dict(self):
        """Test the structured certificate form."""
        record = find_strong_deviation(self.g, self.sigma, 2).to_dict()
        self.assertEqual(record["coalition"], [0, 1])
        self.assertEqual(record["gamma"], [2, 1, 2, 1])
        self.assertEqual(record["sigma"], [1, 2, 2, 1])
        self.assertEqual(record["graph"]["n"], 4)
        self.assertEqual(record["k"], 2)

    def test_matches_brute_force(self):
        """Test the exact search against plain enumeration on small graphs."""
        for g in graph_atlas(4, 1):
            for k in (2, 3):
                for sigma in canonical_colorings(g.n, k):
                    with self.subTest(graph=g, sigma=sigma.colors):
                        self.assertEqual(find_strong_deviation(g, sigma, g.n).found, brute_force_deviates(g, sigma, g.n))

    def test_pruning_equivalence_on_nash(self):
        """Test that every level gives the same existence answer from a NE."""
        for g in graph_atlas(5, 2):
            for sigma in canonical_colorings(g.n, 2):
                if not is_nash(g, sigma)[0]:
                    continue
                with self.subTest(graph=g, sigma=sigma.colors):
                    answers = {level: find_strong_deviation(g, sigma, g.n, level).found for level in PruningLevel}
                    self.assertEqual(len(set(answers.values())), 1)

    def test_optima_are_strong_equilibria(self):
        """Test that optimal colourings of small graphs have no strong deviation."""
        for g in graph_atlas(5, 2):
            for sigma in enumerate_optimal(g, 2):
                with self.subTest(graph=g, sigma=sigma.colors):
                    self.assertTrue(is_q_se(g, sigma, g.n))

    def test_iter_strong_deviations_order(self):
        """Test that certificates come in scan order."""
        certs = list(iter_strong_deviations(self.g, self.sigma, 4))
        keys = [cert.scan_key for cert in certs]
        self.assertEqual(keys, sorted(keys))
        self.assertEqual(certs[0].coalition, (0, 1))
        self.assertIn((2, 3), [cert.coalition for cert in certs])


class TestMinimality(unittest.TestCase):
    def test_double_gadget_has_non_minimal_deviation(self):
        """Test a coalition made of two independent swaps."""
        g, sigma = double_swap_gadget()
        by_coalition = {}
        for cert in iter_strong_deviations(g, sigma, 4):
            by_coalition.setdefault(cert.coalition, cert)
        union = by_coalition[(0, 1, 4, 5)]
        self.assertFalse(union.minimal)
        self.assertFalse(is_minimal(g, sigma, union))
        self.assertTrue(by_coalition[(0, 1)].minimal)
        self.assertTrue(is_minimal(g, sigma, by_coalition[(4, 5)]))

    def test_minimal_undecided_for_restricted_scans(self):
        """Test that a scan restricted to one leading vertex leaves minimality open."""
        g, sigma = swap_gadget()
        search = DeviationSearch(g, sigma)
        cert = next(search.scan(2, leading=2))
        self.assertEqual(cert.coalition, (2, 3))
        self.assertIsNone(cert.minimal)

    def test_deviations_of(self):
        """Test the recolourings of a single coalition."""
        g, sigma = swap_gadget()
        search = DeviationSearch(g, sigma)
        targets = [cert.target.colors for cert in search.deviations_of((0, 1))]
        self.assertEqual(targets, [(2, 1, 2, 1)])
        self.assertEqual(list(DeviationSearch(g, sigma).deviations_of((0, 2))), [])


class TestVerifyCertificate(unittest.TestCase):
    def setUp(self):
        self.g, self.sigma = swap_gadget()
        self.cert = find_strong_deviation(self.g, self.sigma, 2)

    def test_tampered_gains(self):
        """Test that a wrong gain vector is rejected."""
        bad = DeviationCertificate(self.g, self.sigma, (0, 1), self.cert.target, (1, 2), 2)
        self.assertFalse(verify_certificate(self.g, self.sigma, bad))

    def test_wrong_coalition(self):
        """Test that the coalition must equal the deviating set."""
        bad = DeviationCertificate(self.g, self.sigma, (0, 1, 2), self.cert.target, (1, 1, 0), 2)
        self.assertFalse(verify_certificate(self.g, self.sigma, bad))

    def test_not_strong(self):
        """Test that a member without gain fails verification."""
        gamma = Coloring((2, 2, 2, 1), 2)
        bad = DeviationCertificate(self.g, self.sigma, (0,), gamma, (0,), 0)
        self.assertFalse(verify_certificate(self.g, self.sigma, bad))


class TestAudit(unittest.TestCase):
    def test_swap_audit(self):
        """Test the structural flags of the 4-cycle swap."""
        g, sigma = swap_gadget()
        cert = find_strong_deviation(g, sigma, 2)
        report = audit_minimal_deviation(g, sigma, cert)
        self.assertTrue(report.kc_preserved)
        self.assertTrue(report.neighbor_color_ok)
        self.assertTrue(report.size_ge_2)
        self.assertTrue(report.cut_gain_bound_ok)
        self.assertFalse(report.color_range_applicable)
        self.assertIsNone(report.color_range_positive)
        # the swapping pair keeps edges to the rest of the cycle
        self.assertFalse(report.isolated_component_ok)
        self.assertEqual([finding.claim for finding in report.violations], ["isolated_component"])
        self.assertFalse(report.passed)
        self.assertEqual(report.to_dict()["violations"][0]["claim"], "isolated_component")

    def test_preconditions(self):
        """Test that unsuitable certificates are refused."""
        g, sigma = swap_gadget()
        cert = find_strong_deviation(g, sigma, 2)
        with self.assertRaises(AuditPreconditionError) as ctx:
            audit_minimal_deviation(g, Coloring((1, 1, 2, 2), 2), cert)
        self.assertEqual(ctx.exception.precondition, "exact_deviating_set")

        double, double_sigma = double_swap_gadget()
        union = next(c for c in iter_strong_deviations(double, double_sigma, 4) if c.coalition == (0, 1, 4, 5))
        with self.assertRaises(AuditPreconditionError) as ctx:
            audit_minimal_deviation(double, double_sigma, union)
        self.assertEqual(ctx.exception.precondition, "minimal")

        line = Graph(2, [(0, 1)])
        single = find_strong_deviation(line, Coloring((1, 1), 2), 1)
        with self.assertRaises(AuditPreconditionError) as ctx:
            audit_minimal_deviation(line, Coloring((1, 1), 2), single)
        self.assertEqual(ctx.exception.precondition, "nash")


class TestCertificatePool(unittest.TestCase):
    def test_best_is_scan_order_minimum(self):
        """Test that the pool answers the scan-order minimum regardless of insertion order."""
        g, sigma = double_swap_gadget()
        certs = list(iter_strong_deviations(g, sigma, 2))
        pool = CertificatePool()
        self.assertTrue(pool.is_empty())
        self.assertIsNone(pool.best())
        for cert in reversed(certs):
            pool.add(cert)
        self.assertEqual(pool.size(), len(certs))
        self.assertEqual(pool.best(), certs[0])
        pool.clear()
        self.assertTrue(pool.is_empty())

    def test_complete_graph_optimum(self):
        """Test that the proper colouring of K4 is a 4-strong equilibrium."""
        g = complete_graph(4)
        self.assertTrue(is_q_se(g, Coloring((1, 2, 3, 4), 4), 4))


if __name__ == "__main__":
    unittest.main()
