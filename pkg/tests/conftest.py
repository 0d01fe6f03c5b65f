import numpy as np
import pytest

from cstar_schur import AlgebraShape, AMatrix, Element

COMMUTATIVE_SHAPES = [
    AlgebraShape((1,)),
    AlgebraShape((1, 1)),
    AlgebraShape((1, 1, 1, 1)),
]
NONCOMMUTATIVE_SHAPES = [
    AlgebraShape((2,)),
    AlgebraShape((2, 1)),
    AlgebraShape((3,)),
]


def comm_element(shape: AlgebraShape, *values) -> Element:
    """Element of a commutative algebra from one complex number per block."""
    assert shape.is_commutative and len(values) == len(shape.blocks)
    return Element(shape, [[[complex(v)]] for v in values])


def scalar_amatrix(rows) -> AMatrix:
    """Matrix over the one-block scalar algebra from a plain 2D array."""
    shape = AlgebraShape((1,))
    return AMatrix.from_entries(
        [[comm_element(shape, z) for z in row] for row in rows]
    )


def as_numpy(M: AMatrix) -> np.ndarray:
    """The flattened single-block form of a scalar-algebra matrix."""
    from cstar_schur import flatten

    assert M.shape == AlgebraShape((1,))
    return flatten(M)[0]


@pytest.fixture
def m2_shape():
    return AlgebraShape((2,))


@pytest.fixture
def mixed_shape():
    return AlgebraShape((2, 1))
