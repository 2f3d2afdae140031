from .items import (
    DEFAULT_CELLS, GalleryItem, Linear, LogPowerAntiderivative, LogPowerRadial, LogPowerSlice,
    PowerFamily, PowerSingularity, Shifted, SignedField, Tag, Truncation, ZeroExtension,
    boundary_constant, gradient_coefficient, lower_envelope_constant, lower_envelope_profile,
    make_linear, make_power_singularity, make_u_radial, make_u_slice, make_up, make_up_shifted,
    make_v, sobolev_norm,
)
from .transforms import LatticeOp, extend_by_zero, lattice, truncate
from .parser import parse_item
from .catalog import DEFAULT_EXPONENT, DEFAULT_ITEM_IDS, CatalogEntry, ClosedFormCatalog, agree
