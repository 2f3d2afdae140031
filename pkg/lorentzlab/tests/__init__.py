from .test_catalog import *
from .test_checks import *
from .test_cli import *
from .test_foundations import *
from .test_gallery import *
from .test_norms import *
from .test_parser import *
from .test_rearrangement import *
from .test_report import *
from .test_sampling import *
from .test_suite import *
from .test_sweep import *
from .test_transforms import *
from .test_util import *
