"""Exact Hecke operator computations on Siegel modular forms of squarefree level.

Submodules:

* ``scalars``   exact Laurent polynomials over Q and roots of unity
* ``fpspaces``  subspaces and quadratic spaces over F_p
* ``lattices``  Gram lattices, p-types, sublattice enumeration
* ``hecke``     lattice-indexed Hecke action and intertwining coefficients
* ``verify``    brute-force checks of the intertwining identities
* ``cusps``     cusps of Gamma_0(N) and their representative matrices
* ``eisenstein`` characters and eigenvalues of Klingen-Eisenstein lifts
"""

from .scalars import LaurentScalar, RootOfUnity, const, symbol

__version__ = "0.1.0"

__all__ = ["LaurentScalar", "RootOfUnity", "const", "symbol", "__version__"]
