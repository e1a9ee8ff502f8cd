# -*- coding: utf-8 -*-
#
# ICRevenue documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing dir.

import sys, os

sys.path.insert(0, os.path.abspath(os.path.join('..', '..', 'src')))
import icrevenue

# -- General configuration -----------------------------------------------------

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.intersphinx',
              'sphinx.ext.mathjax']

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = icrevenue.__package_name__
copyright = icrevenue.__documentation_copyright__

# The short X.Y version.
version = '.'.join(icrevenue.__version__.split('.')[:2])
release = icrevenue.__version__

exclude_patterns = []
pygments_style = 'sphinx'

# -- Options for HTML output ---------------------------------------------------

html_theme = 'sphinxdoc'
html_static_path = ['_static']
htmlhelp_basename = icrevenue.__package_name__ + u'doc'

# -- Options for LaTeX output --------------------------------------------------

latex_documents = [
  ('index',
   icrevenue.__package_name__ + '.tex',
   icrevenue.__package_name__ + u' Documentation',
   icrevenue.__documentation_author__,
   'manual'),
]

# -- Options for manual page output --------------------------------------------

man_pages = [
    ('index',
     icrevenue.__package_name__.lower(),
     icrevenue.__package_name__ + u' Documentation',
     [icrevenue.__documentation_author__], 1)
]

intersphinx_mapping = {'python': ('https://docs.python.org/3', None),
                       'numpy': ('https://numpy.org/doc/stable/', None),
                       'networkx': ('https://networkx.org/documentation/stable/',
                                    None)}

# Autodoc settings
autodoc_member_order = 'bysource'
