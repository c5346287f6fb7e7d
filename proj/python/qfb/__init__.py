"""Exact quadratic forms over fields of characteristic not 2.

Fields, forms and symbols are passed as text, in the same grammar as the
``qfb`` command line tool (see docs/formats.md).
"""

from ._qfb import QfbError, classify, construct, hilbert, index, run_cli, transfer

__all__ = ["QfbError", "classify", "construct", "hilbert", "index", "run_cli", "transfer"]
