"""
setup.py shim for the version scheme of pull-request builds.

Metadata lives in pyproject.toml. setuptools_scm cannot take a callable
local scheme from pyproject.toml, so it is passed here.
"""

import os

from setuptools import setup


def local_scheme(version):
    """
    Local version part for reeb-surgery builds.

    Pull-request builds get ``.dev<run id>`` so that test uploads of the
    same base version never collide; release builds get nothing.
    """
    if not os.environ.get("IS_PULL_REQUEST"):
        return ""
    return f".dev{os.environ.get('GITHUB_RUN_ID', 'local')}"


setup(use_scm_version={"local_scheme": local_scheme})
