# -*- coding: utf-8 -*-
#
# asf documentation build configuration file
#

import sys
import os

# -- mock heavy and optional modules, so the API docs build without them

import mock

MOCK_MODULES = [
    'matplotlib',
    'matplotlib.pyplot',
    'numpy',
    'flask',
    'requests',
    'tabulate',
]

for mod_name in MOCK_MODULES:
    sys.modules[mod_name] = mock.Mock()

sys.path.insert(0, os.path.abspath('../..'))

import asf
print('asf version:', asf.__version__)


# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.intersphinx',
]

autodoc_member_order = 'bysource'

source_suffix = '.rst'
master_doc = 'index'

project = u'asf'

version = asf.__version__
release = asf.__version__

exclude_patterns = ['_build']

add_function_parentheses = False
pygments_style = 'sphinx'
autoclass_content = 'both'


# -- Options for HTML output ----------------------------------------------

html_theme = 'bootstrap'

import sphinx_bootstrap_theme
html_theme_path = sphinx_bootstrap_theme.get_html_theme_path()
html_theme_options = {
    'bootswatch_theme': "sandstone",
}

html_last_updated_fmt = '%b %d, %Y'
htmlhelp_basename = 'asfdoc'

intersphinx_mapping = {'python': ('https://docs.python.org/3', None)}
