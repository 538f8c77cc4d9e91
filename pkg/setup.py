#! /usr/bin/env python
####################################################################################################

from setuptools import setup

setup(
    name='ppedge',
    version='0.1.0',
    description='Boundary estimation for the support of planar Poisson point processes',
    keywords='poisson point process boundary frontier estimation orthogonal series',
    license='GPLv3',
    packages=['ppedge', 'ppedge.test'],
    package_data={'': ['LICENSE.txt']},
    include_package_data=True,
    entry_points={'console_scripts': ['ppedge=ppedge.cmdline:main']},
    install_requires=['pyrsistent>=0.11',
                      'six>=1.10',
                      'numpy>=1.17',
                      'scipy>=1.2',
                      'pandas>=0.25'])
