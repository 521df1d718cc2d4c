#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# noonsim documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

# -- General configuration ------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.mathjax",
    "sphinxcontrib.autoprogram",
    "recommonmark",
]

# Add any paths that contain templates here, relative to this directory.
templates_path = ["_templates"]

from recommonmark.transform import AutoStructify


def setup(app):
    app.add_config_value(
        "recommonmark_config", {"auto_toc_tree_section": "Contents"}, True
    )
    app.add_transform(AutoStructify)


source_suffix = [".rst", ".md"]

# The master toctree document.
master_doc = "index"

# General information about the project.
project = "noonsim"
copyright = "2020, noonsim contributors"
author = "noonsim contributors"

# The short X.Y version.
import noonsim

version = noonsim.__version__
# The full version, including alpha/beta/rc tags.
release = version

language = None

exclude_patterns = []

# The name of the Pygments (syntax highlighting) style to use.
pygments_style = "sphinx"

todo_include_todos = False

# -- Options for HTML output ----------------------------------------------

html_theme = "alabaster"

html_sidebars = {}

htmlhelp_basename = "noonsimdoc"

# -- Options for manual page output ---------------------------------------

# One entry per manual page. List of tuples
# (source start file, name, description, authors, manual section).
man_pages = [(master_doc, "noonsim", "noonsim Documentation", [author], 1)]
