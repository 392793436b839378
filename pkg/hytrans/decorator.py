__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

from functools import wraps

import hytrans.molecule


def ensure_molecule(func):
    """
    Ensure the first argument is a Molecule, loading it when given a
    document, a path or a packaged molecule name.
    """

    @wraps(func)
    def wrapper(molecule, *args, **kwargs):
        if not isinstance(molecule, hytrans.molecule.Molecule):
            molecule = hytrans.molecule.load_molecule(molecule)
        return func(molecule, *args, **kwargs)

    return wrapper


def ensure_environment(func):
    """
    Fill a missing environment (second argument) from the molecule document,
    falling back to the default field and temperature.
    """

    @wraps(func)
    def wrapper(molecule, env=None, *args, **kwargs):
        if env is None:
            env = molecule.environment or hytrans.molecule.Environment()
        return func(molecule, env, *args, **kwargs)

    return wrapper
