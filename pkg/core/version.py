from importlib import metadata

try:
    # The package name is normalized to lowercase by packaging tools
    __version__ = metadata.version("ecquiver")
except metadata.PackageNotFoundError:
    # Running from a source checkout without an install.
    __version__ = "0.0.0-dev"
