"""Finite measure spaces, functor targets and the unique map out of simple functions."""

from initial_integrals.measures.axioms import *  # noqa: F401,F403
from initial_integrals.measures.spaces import *  # noqa: F401,F403
from initial_integrals.measures.targets import *  # noqa: F401,F403
from initial_integrals.measures import axioms as _a, spaces as _s, targets as _t

__all__ = list(_s.__all__) + list(_t.__all__) + list(_a.__all__)
