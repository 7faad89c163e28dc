import os

from setuptools import setup, find_packages

HERE = os.path.dirname(os.path.abspath(__file__))
PINNED_TXT = 'pinned.txt'


def load_pinned_deps(path=os.path.join(HERE, PINNED_TXT)):
    """Package names from pinned.txt, without their version pins"""
    try:
        with open(path) as fh:
            for req in fh:
                req = req.strip()
                if req and not req.startswith('#'):
                    yield req.split('==')[0]
    except IOError:
        return


setup(
    package_dir={'': 'src'},
    include_package_data=True,
    packages=find_packages('src'),
    package_data={'prkit': ['fixtures/*.json']},

    name='prkit',
    version='0.1.0',
    license='GPL-3.0',
    description='Poincare-Reeb graphs of planar algebraic domains, and '
                'algebraic domains realizing a given graph',
    long_description=open(os.path.join(HERE, 'README.txt')).read(),
    python_requires='>=3.8',
    install_requires=list(load_pinned_deps()),
    tests_require=["coverage>=4.3.1"],
    entry_points={
        'console_scripts': [
            'prkit=prkit.cli:main',
        ],
    }
)
