#!/usr/bin/env python
#
# Sphinx configuration for the softpath documentation.

import os
import sys

sys.path.insert(0, os.path.abspath(".."))

import softpath  # noqa: E402

# -- General configuration ---------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.intersphinx",
    "sphinx.ext.viewcode",
    "sphinx_copybutton",
    "m2r2",
    "numpydoc",
]

# README and CONTRIBUTING are pulled in through m2r2
source_suffix = {
    ".rst": "restructuredtext",
    ".md": "markdown",
}
main_doc = "index"

project = "softpath"
copyright = "2026"
author = "softpath developers"
version = softpath.__version__
release = softpath.__version__

exclude_patterns = ["_build"]

# NamedTuple fields are documented in the class docstrings
numpydoc_show_class_members = False
autoclass_content = "both"

# Strip shell and REPL prompts from copied snippets
copybutton_prompt_text = r">>> |\.\.\. |\$ "
copybutton_prompt_is_regexp = True

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable", None),
}

# -- HTML output -------------------------------------------------------

html_theme = "furo"
htmlhelp_basename = "softpathdoc"
