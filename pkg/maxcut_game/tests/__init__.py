"""
Test suite for the max k-cut game engine.
"""
