"""Finitely generated and pure-injective CM-modules over F[[x,y]]/(x^2).

Subpackages: ``kernel`` (series, matrices, Smith normal form) and ``formulas``
(pp-formula language, realizations, the pattern lattice).  Modules: ``cm``,
``points``, ``ziegler``, ``mdim``, ``radical``, ``quilt``, ``acceptance`` and ``cli``.
"""

from .cm import INF, FgCM, I, Indec, MorphCM, NonSquareZero, block_sum, canonical, decompose
from .kernel import QQ, GF, InsufficientPrecision, SeriesMatrix, TruncSeries, parse_field
from .ordinals import OMEGA, SmallOrdinal

__version__ = "0.1.0"
