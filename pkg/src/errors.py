"""
Errors Module
Exception hierarchy shared by the category-theory engine and its CLI
"""


class CategoryLabError(ValueError):
    """Base class for every error raised by the engine"""


class DimensionMismatchError(CategoryLabError):
    """Matrix or vector shapes do not fit together"""


class EndpointMismatchError(CategoryLabError):
    """Two morphisms are not composable, or a morphism has the wrong endpoints"""


class InfiniteHomSetError(CategoryLabError):
    """A path category has an infinite hom-set (the quiver has a cycle)"""


class IncompleteLocalisationError(CategoryLabError):
    """Zigzag enumeration did not stabilise below the length bound"""


class NotAbelianError(CategoryLabError):
    """Kernels are requested at a level where no kernel presentation exists"""


class RelationOutsideSpanError(CategoryLabError):
    """A relation handed to subquotient is not in the span of the generators"""


class QuiverFormatError(CategoryLabError):
    """A quiver document failed to parse or validate"""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class GuardrailError(CategoryLabError):
    """A brute-force computation was requested past its configured bound"""
