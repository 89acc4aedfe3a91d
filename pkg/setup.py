from setuptools import setup, find_packages

setup(
    name="pathlike-length",
    version="0.1.0",
    packages=find_packages(exclude=["tests"]),
    install_requires=[
        "numpy>=1.24.0",
        "scipy>=1.10.0",
        "python-dotenv>=1.0.0",
    ],
    extras_require={
        "test": [
            "pytest>=7.0.0",
            "hypothesis>=6.80.0",
            "mpmath>=1.3.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "pathlike=pathlike.cli:main",
        ],
    },
    description=(
        "Closed forms and brute-force oracles for the integral of length "
        "over path spaces on constant-curvature surfaces"
    ),
    keywords="bessel-clifford, continuous binomial, path integral, curvature, cli",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Programming Language :: Python :: 3.13",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",
)
