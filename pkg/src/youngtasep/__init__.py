"""Modified TASEP, Young-graph growth and their dimer and variational descriptions."""
from . import dimer, mtasep, shape, young
from .errors import (
    BoundaryError, ContainmentError, DomainError, GaugeError, NumericalError, ShapeError, SizeError,
    WindowError, YoungTasepError,
)

__version__ = "0.1.0"
