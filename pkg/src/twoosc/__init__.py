"""Two-oscillator quantum group toolkit.

Exact R-matrix machinery, the dual deformed superalgebra, Fock-space
realizations and deformed coherent states.
"""

__version__ = "0.1.0"
