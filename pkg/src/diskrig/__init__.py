"""diskrig: numerical verification of boundary rigidity for conformal
pseudometrics on the unit disk, with the unit-ball Kobayashi geometry
specialization in several complex variables."""

__version__ = "0.1.0"
