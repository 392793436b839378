__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

__version__ = "0.1.0"
AUTHOR = "The hytrans Authors"
EMAIL = "hytrans@users.noreply.github.com"
NAME = "hytrans"
KEYWORDS = "nmr, nv center, spin dynamics, sensitivity, j-coupling, chemical shift"
DESCRIPTION = "Hydrogen-transfer microscale NMR protocol simulator with NV-ensemble readout"
LICENSE = "Apache-2.0"

################################################################################
# Global requirements

INSTALL_REQUIRES = (
    ("jsonschema", {"min_version": None}),
    ("numpy", {"min_version": "1.22"}),
    ("scipy", {"min_version": "1.8"}),
    ("pandas", {"min_version": "1.5"}),
)

TESTS_REQUIRES = (("pytest", {"min_version": "4.6.2"}),)

INSTALL_REQUIRES_ALL = INSTALL_REQUIRES + TESTS_REQUIRES
