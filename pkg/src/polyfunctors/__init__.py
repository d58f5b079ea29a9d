"""Exact computations with polynomial functors and subsets determined by a fixed space."""

from .functors import (
    OrderVerdict,
    PolynomialFunctor,
    compare,
    constant,
    degree_part,
    dim_at,
    direct_sum,
    schur,
    schur_weyl,
    shift,
    tensor,
)
from .partitions import Partition, lr_coefficient, partitions_of, schur_dim, skew_schur_dim, syt_count
from .dsl import Transformation, parse
from .tensors import DenseTensor, apply_linear
from .subsets import Point, SubsetSpec, determinacy_experiment, pullback_member

__version__ = "0.1.0"
