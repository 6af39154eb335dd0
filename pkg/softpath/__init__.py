"""Top-level package for softpath."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("softpath")
except PackageNotFoundError:
    __version__ = "uninstalled"

__author__ = "softpath developers"
