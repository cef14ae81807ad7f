"""Polarized Hodge-Lefschetz structures on cohomology rings and the flat
Higgs bundle over the complexified Kahler cone."""

__version__ = "0.1.0"
