"""Layered garment engine: bodies, garments, registration, shape spaces, segmentation and evaluation."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__, WardrobeError  # noqa: F401
