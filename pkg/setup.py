import os
from setuptools import setup, find_packages

here = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(here, 'README.rst')) as f:
    README = f.read()

installation_requirements = [
    "numpy>=1.21",
    "scipy>=1.7",
    "termcolor>=1.1.0"
]

test_requirements = installation_requirements + [
    "flake8>=3.2.1",
    "hypothesis>=6.0",
    "pytest>=6.0",
    "tox>=2.3.1"
]

setup(
    name="sharpconvex",
    version="0.1.0",
    description=(
        "Numerical verification of sharp convexity inequalities on spheres "
        "and hypercontractivity of ultraspherical measures"
    ),
    long_description=README,
    license="MIT",
    classifiers=[
        "Development Status :: 4 - Beta",
        "License :: OSI Approved :: MIT License",
        "Intended Audience :: Science/Research",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Programming Language :: Python :: Implementation :: CPython",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    keywords="quadrature hypercontractivity log-sobolev gegenbauer",
    packages=find_packages(),
    python_requires=">=3.8",
    install_requires=installation_requirements,
    tests_require=test_requirements,
    extras_require={
        "test": test_requirements
    },
    entry_points={
        "console_scripts": [
            "sharpconvex = sharpconvex.cli:main"
        ]
    }
)
