"""Exception hierarchy shared by every module of the package."""


class Hex2TetError(Exception):
    """Base class for all errors raised by hex2tet."""


class MeshStructureError(Hex2TetError):
    pass


class NonManifoldFace(MeshStructureError):
    """A quad face is shared by more than two hexahedra."""


class DanglingVertex(MeshStructureError):
    """A hexahedron references a vertex that does not exist."""


class DuplicateVertex(MeshStructureError):
    """A hexahedron lists the same vertex twice."""


class BadDiagonal(Hex2TetError):
    """A vertex pair is not one of the two diagonals of the quad it names."""


class UnknownFace(BadDiagonal):
    """A prescription names a vertex set that is not a face of the complex."""


class NotOpposite(Hex2TetError):
    pass


class NotCut(Hex2TetError):
    pass


class DifferentOrientationPair(Hex2TetError):
    """An opposite face pair whose diagonals do not span a diagonal plane."""


class DegeneratePrism(Hex2TetError):
    """RRR or FFF side cuts: the prism has no tetrahedralization."""


class IllegalConfig(Hex2TetError):
    pass


class NotFiveEligible(Hex2TetError):
    pass


class UnresolvedDegenerate(Hex2TetError):
    """A degenerate hexahedron could be neither flipped nor Steiner-split."""


class FlipBreaksMarkedNeighbor(Hex2TetError):
    pass


class ParseError(Hex2TetError):
    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = [str(path)] if path is not None else []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class UnsupportedElement(ParseError):
    pass
