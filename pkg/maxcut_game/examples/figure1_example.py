#!/usr/bin/env python3
"""
Walk through the six-vertex worked example: payoffs, the example deviation,
the NE check, the optimum and a strong-equilibrium check of the optimum.
"""

from maxcut_game import find_strong_deviation, is_nash, max_cut_exact, run_best_response
from maxcut_game.core.fixtures import FIGURE1_COALITION, figure1_gamma, figure1_graph, figure1_sigma, swap_gadget
from maxcut_game.core.game import cut_value, p_c, payoff_gains, payoffs, payoffs_csv


def worked_example():
    """Payoffs and the example deviation."""
    print("Worked example")
    print("==============")

    g = figure1_graph()
    sigma = figure1_sigma()
    gamma = figure1_gamma()
    coalition = sorted(FIGURE1_COALITION)

    print(payoffs_csv(g, sigma))
    print(f"S(sigma) = {cut_value(g, sigma)}, SW(sigma) = {sum(payoffs(g, sigma))}")
    print(f"S(gamma) = {cut_value(g, gamma)}, P_C = {p_c(g, sigma, gamma, coalition)}")
    print(f"Gains of {[g.name_of(v) for v in coalition]}: {payoff_gains(g, sigma, gamma, coalition)}")

    nash, witness = is_nash(g, sigma)
    if not nash:
        v, a = witness
        print(f"Not a NE: {g.name_of(v)} gains by switching to colour {a}")

    trace = run_best_response(g, sigma)
    print(f"Best-response dynamics: {len(trace.steps)} steps, {trace.terminal.value}, S = {cut_value(g, trace.final)}")

    optimum = max_cut_exact(g, 3)
    best = optimum.witnesses[0]
    print(f"Maximum 3-cut: {optimum.best_value} with colouring {best.to_list()}")
    result = find_strong_deviation(g, best, g.n)
    print(f"Strong deviation from the optimum: {'found' if result.found else 'none'}")


def swap_example():
    """A NE that two players leave together."""
    print("\nSwap gadget")
    print("===========")

    g, sigma = swap_gadget()
    print(f"NE: {is_nash(g, sigma)[0]}, S = {cut_value(g, sigma)}")
    cert = find_strong_deviation(g, sigma, 2)
    print(f"Coalition {list(cert.coalition)} moves to {cert.target.to_list()} with gains {list(cert.gains)}")
    print(f"Cut change: {cert.delta_s:+d}, minimal: {cert.minimal}")


if __name__ == "__main__":
    worked_example()
    swap_example()
