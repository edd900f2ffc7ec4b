#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# slicesla documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys

sys.path.insert(0, os.path.abspath(".."))


# -- General configuration ------------------------------------------------

extensions = ["sphinx.ext.autodoc"]

templates_path = ["_templates"]

source_suffix = ".rst"

master_doc = "index"

project = "slicesla"
copyright = "2026, slicesla developers"
author = "slicesla developers"

# The short X.Y version.
version = "0.1"
# The full version, including alpha/beta/rc tags.
release = "0.1.0"

language = None

exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]

pygments_style = "sphinx"

todo_include_todos = False

# Members are listed in source order, the modules read top-down
autodoc_member_order = "bysource"


# -- Options for HTML output ----------------------------------------------

html_theme = "alabaster"

html_static_path = ["_static"]

# This is required for the alabaster theme
# refs: http://alabaster.readthedocs.io/en/latest/installation.html#sidebars
html_sidebars = {"**": ["about.html", "navigation.html", "relations.html", "searchbox.html"]}


# -- Options for HTMLHelp output ------------------------------------------

htmlhelp_basename = "slicesladoc"


# -- Options for LaTeX output ---------------------------------------------

latex_elements = {}

latex_documents = [(master_doc, "slicesla.tex", "slicesla Documentation", author, "manual")]


# -- Options for manual page output ---------------------------------------

man_pages = [(master_doc, "slicesla", "slicesla Documentation", [author], 1)]


# -- Options for Texinfo output -------------------------------------------

texinfo_documents = [
    (
        master_doc,
        "slicesla",
        "slicesla Documentation",
        author,
        "slicesla",
        "SLA lifecycle, availability penalties and economics for network slices.",
        "Miscellaneous",
    )
]
