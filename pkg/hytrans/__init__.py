from hytrans.version import __version__
