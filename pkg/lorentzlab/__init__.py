from .exceptions import (
    DomainError, GalleryIdError, LorentzLabError, PreconditionError, QuadratureError,
    UnsupportedFamilyError,
)
from .foundations import INFINITY, BallDomain, ExponentPair, Interval1D, unit_ball_volume
from .norms import DEFAULT_QUAD, NormKind, NormValue, QuadratureSpec, quasinorm, starstar_norm
from .rearrangement import SampledField, StepProfile, rearrange
from .gallery import ClosedFormCatalog, parse_item, sobolev_norm
from .lab import Suite, witness_strict_inclusion

__version__ = '0.1.0'
