"""
carnot-conformal - Test Suite

Tests for the algebra, metric, conformal structure, automorphism and modulus
layers and the command line.
"""
