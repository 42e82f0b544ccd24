#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# ludreg documentation build configuration file
#
# The documentation can be built by invoking
#   sphinx-build -b html docs docs/.build

import sys
import os
import guzzle_sphinx_theme

# Make the package importable for autodoc without installing it
sys.path.insert(0, os.path.abspath(os.path.join('..', 'src')))

from ludreg.config import LUDREG_VERSION  # noqa: E402

# -- General configuration ------------------------------------------------

needs_sphinx = '2.4'

templates_path = ['_templates']
source_suffix = '.rst'

rst_prolog = r"""
.. role:: paramtype

.. role:: monosp

.. |float| replace:: :paramtype:`float`
.. |int| replace:: :paramtype:`integer`
.. |numpy| replace:: :monosp:`numpy`
.. |scipy| replace:: :monosp:`scipy`

"""

master_doc = 'index'

project = 'ludreg'
copyright = '2026, the ludreg developers'
author = 'the ludreg developers'
version = '.'.join(LUDREG_VERSION.split('.')[:2])
release = LUDREG_VERSION

language = None
exclude_patterns = ['.build']
default_role = 'any'

html_theme_path = guzzle_sphinx_theme.html_theme_path()
html_theme = 'guzzle_sphinx_theme'

extensions = []
extensions.append("guzzle_sphinx_theme")
extensions.append("sphinx.ext.mathjax")
extensions.append("sphinx.ext.autodoc")
extensions.append('sphinx.ext.todo')
todo_include_todos = True

autodoc_member_order = 'bysource'

html_theme_options = {
    "project_nav_name": "ludreg"
}

html_sidebars = {
    '**': ['logo-text.html', 'globaltoc.html', 'searchbox.html']
}

html_show_sourcelink = False
htmlhelp_basename = 'ludreg_doc'

latex_documents = [
    (master_doc, 'ludreg.tex', 'ludreg Documentation', author, 'manual'),
]

man_pages = [
    (master_doc, 'ludreg', 'ludreg Documentation', [author], 1)
]

primary_domain = 'py'
highlight_language = 'python'
