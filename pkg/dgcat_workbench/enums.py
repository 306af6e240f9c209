from enum import Enum, IntEnum


class FieldKind(Enum):
    RATIONAL = "q"
    PRIME    = "fp"


class Side(Enum):
    LEFT  = "left"
    RIGHT = "right"


class ReprKind(Enum):
    STRICT   = "strict"     # T_A ≅ h_{F(A)}
    HOMOTOPY = "homotopy"   # T_A ≈ h_{F(A)}, invertible in H⁰
    QUASI    = "quasi"      # T_A qis≈ h_{F(A)}


class ExitCode(IntEnum):
    OK          = 0
    NEGATIVE    = 1   # verified negative answer, e.g. no adjoint
    INVALID     = 2   # validation or workspace format error
    UNCERTIFIED = 3   # derived operation refused an uncertified resolution


class Level(Enum):
    EXACT   = "exact"     # triangle identities hold on the nose
    DERIVED = "derived"   # unit lifted through n, triangles hold in H⁰
