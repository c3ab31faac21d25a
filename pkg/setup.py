"""Setup file for using zetacensus as a python package."""
from os import path

import setuptools

# Obtain long_description from README.md
here = path.abspath(path.dirname(__file__))
with open(path.join(here, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

setuptools.setup(
    name='zeta-census',
    version='0.0.1',
    long_description=long_description,
    description='Multiprecision evaluation of the Riemann zeta function and its '
    'derivatives, with zero censuses and audits of the inequalities behind '
    'the distribution of the zeros of zeta\'\'.',
    license='CC0-1.0',
    packages=setuptools.find_packages(exclude=['test']),
    install_requires=[
        'joblib',
        'mpmath',
        'numpy',
        'pyyaml',
    ],
    entry_points={
        'console_scripts': [
            'zc-run=zetacensus.run:main'
        ],
    },
    scripts=[
        'scripts/census.sh',
        'scripts/audits.sh',
    ],
)
