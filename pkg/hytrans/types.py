__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

from typing import Union

import numpy as np

# anything numpy's default_rng accepts as a seed
seed_type = Union[None, int, np.random.SeedSequence]
