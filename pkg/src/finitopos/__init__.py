"""Finite models of topological and topos-theoretic constructions.

Modules: ``finspace`` (finite spaces and Heyting algebras of opens),
``fincat`` (finite categories), ``presheaf`` (presheaves and the adjoint
quadruple), ``site`` (Grothendieck topologies and sheafification),
``forcing`` (intuitionistic formulas over opens) and ``simplicial``
(nerves and groupoid connectivity).
"""

from .errors import BudgetExceeded, FormatError, PreconditionError, Report, WorkbenchError

__all__ = ["BudgetExceeded", "FormatError", "PreconditionError", "Report", "WorkbenchError"]
__version__ = "0.1.0"
