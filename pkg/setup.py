#!/usr/bin/env python

import unittest
import sys
import os

from setuptools import find_packages, setup

def discover_asf_tests():
    _tl = unittest.TestLoader()
    _ts = _tl.discover('asf/test', 'test_*.py')
    return _ts

def read_local(filename):
    _path = os.path.join(os.path.dirname(__file__), filename)
    if os.path.exists(_path):
        return open(_path).read()
    return ""

def get_version():
    '''get asf version without importing the whole package'''
    _tmp_locals = {}
    exec(read_local("asf/_version_info.py"), _tmp_locals)
    return _tmp_locals['__version__']

setup(
    name='asf',
    version=get_version(),
    description='Analytics service framework: registry, catalogs, workflows and experiment generation '
                'for AI services',
    long_description=read_local('README.rst'),
    long_description_content_type="text/x-rst",
    packages=find_packages(exclude=['examples', 'examples.*']),
    package_data={'asf': ['config/*.yaml', 'config/*.yml']},
    entry_points={
        'console_scripts': ['asf = asf.api.cli:console_main'],
    },
    test_suite='setup.discover_asf_tests',
    keywords=("ai services registry catalog federation fair workflow scheduling "
              "experiment generation hyperparameter sweep translation benchmark"),
    license='GPL3',
    install_requires=[
        'NumPy',
        'tabulate',
        'matplotlib',
        'PyYaml',
        'six',
        'Flask',
        'requests',
    ],
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Intended Audience :: Developers',
        'Topic :: Scientific/Engineering',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
        'Topic :: System :: Distributed Computing',
        'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.6',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
    ],
)
