from fractions import Fraction
from typing import TypeAlias

import numpy as np
from numpy.typing import NDArray

Parts: TypeAlias = tuple[int, ...]
Exponent: TypeAlias = tuple[int, ...]
ExactScalar: TypeAlias = Fraction
ExactLike: TypeAlias = Fraction | int | str | float
Vector: TypeAlias = NDArray[np.float64]
Matrix: TypeAlias = NDArray[np.float64]
VectorLike: TypeAlias = NDArray[np.float64] | list[float] | tuple[float, ...]
