#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Setup for genibp"""

import io
from importlib import import_module
from setuptools import setup, find_packages

with open('requirements.txt') as f:
    requirements = f.read().splitlines()
with open('test_requirements.txt') as f:
    test_requirements = f.read().splitlines()

with io.open('README.rst') as readme:
    setup(
        name='genibp',
        version=import_module('genibp').__version__,
        description='generalized Indian buffet processes: sampling, likelihoods, posteriors and verification',
        long_description=readme.read(),
        install_requires=requirements,
        tests_require=test_requirements,
        license='MIT',
        classifiers=[
            'Development Status :: 3 - Alpha',
            'Environment :: Console',
            'Intended Audience :: Science/Research',
            'License :: OSI Approved :: MIT License',
            'Operating System :: OS Independent',
            'Programming Language :: Python',
            'Programming Language :: Python :: 3',
            'Topic :: Scientific/Engineering :: Mathematics',
            'Topic :: Software Development :: Libraries :: Python Modules',
        ],
        keywords='indian buffet process, levy process, completely random measure, bayesian nonparametrics, traitlets',
        zip_safe=True,
        packages=find_packages(exclude=['examples', 'examples.*']),
        package_data={'': ['*.json']},
        entry_points={'console_scripts': ['genibp = genibp.cli.app:main']},
    )
