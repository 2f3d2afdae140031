class LorentzLabError(Exception):
    ''' Base class of every error raised by lorentzlab.'''


class DomainError(LorentzLabError, ValueError):
    ''' An argument lies outside the range an operation is defined on.'''


class PreconditionError(LorentzLabError, ValueError):
    ''' A caller-asserted property (monotonicity, exponent relation) failed
    its spot check.'''


class QuadratureError(LorentzLabError, RuntimeError):
    ''' Adaptive quadrature did not reach the requested tolerance within the
    allowed number of subdivisions. Divergent norms never raise this, they
    are reported as INFINITE.'''


class UnsupportedFamilyError(LorentzLabError, NotImplementedError):
    ''' The profile family has no analytic classification.'''


class GalleryIdError(DomainError):
    ''' A gallery item id does not parse.'''
