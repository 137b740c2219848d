# Configuration file for the Sphinx documentation builder.
#
# This file only contains a selection of the most common options. For a full
# list see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

# -- Project information -----------------------------------------------------

project = 'densicohom'
copyright = '2026, the densicohom developers'
author = 'the densicohom developers'

# -- General configuration ---------------------------------------------------
import sphinx_rtd_theme

extensions = [
    'sphinx.ext.autodoc',
    'sphinx_rtd_theme',
    'sphinx-prompt',
    'sphinx.ext.autosectionlabel',
]

# List of patterns, relative to source directory, that match files and
# directories to ignore when looking for source files.
exclude_patterns = []

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'

# -- Options for Latex output ------------------------------------------------

latex_toplevel_sectioning = 'section'
