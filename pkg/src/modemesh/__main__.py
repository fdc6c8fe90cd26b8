"""Allow ``python -m modemesh`` to behave like the ``modemesh`` script."""

from .cli import entry

entry()
