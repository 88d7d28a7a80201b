"""Version information for carnot-conformal."""

__version__ = "0.3.0"
__author__ = "Christian De Asis"
__email__ = "cdeasis923@gmail.com"
__license__ = "MIT"
__description__ = (
    "Exact Lie algebra arithmetic, preserved subgroup sequences and conformal structures "
    "for nilpotent Lie groups"
)
__url__ = "https://github.com/ch-dev401/carnot-conformal"

__all__ = [
    "__version__",
    "__author__",
    "__email__",
    "__license__",
    "__description__",
    "__url__",
]
