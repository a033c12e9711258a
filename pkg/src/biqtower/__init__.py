"""Arithmetic of a family of biquadratic fields and their 2-class tower groups.

The package computes invariants of fields Q(sqrt(d), i) for radicands
d = p1*p2*q built from primes satisfying a fixed set of congruence and
residue-symbol conditions, predicts the Galois group of the second Hilbert
2-class field as an explicit finite 2-group, and cross-checks everything
against exact group-theoretic computations.
"""

__version__ = "0.1.0"
