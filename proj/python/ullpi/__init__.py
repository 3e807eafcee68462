"""Session-typed pi-calculus workbench.

Thin re-export of the compiled extension. Installed builds place the
extension inside this package; development builds put it on sys.path next
to the build tree.
"""

try:
    from ullpi._ullpi import *  # noqa: F401,F403
    from ullpi._ullpi import __doc__ as _doc
except ImportError:  # development layout: extension at the top level
    from _ullpi import *  # noqa: F401,F403
    from _ullpi import __doc__ as _doc

__doc__ = _doc
__all__ = [
    "check",
    "check_star",
    "classify",
    "reduce",
    "canonical",
    "dual",
    "translate",
    "expand_identity",
    "locality",
    "generate",
    "subject_reduction",
    "progress",
]
