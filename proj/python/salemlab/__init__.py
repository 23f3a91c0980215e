"""Torus measures, their Fourier decay, and lattice counting bounds.

Thin package wrapper around the compiled extension; everything lives in the
``_salemlab`` module and is re-exported here. The extension sits inside the
package when installed via pip and next to it on the build tree's
``PYTHONPATH`` during development.
"""

try:
    from ._salemlab import *  # noqa: F401,F403
    from ._salemlab import __doc__ as _doc
except ImportError:
    from _salemlab import *  # noqa: F401,F403
    from _salemlab import __doc__ as _doc

__doc__ = _doc
