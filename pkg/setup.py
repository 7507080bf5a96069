from setuptools import setup, find_packages

setup(
    name="cfphase",
    version="0.3.0",
    description="Car-following models as multi-phase dynamical systems: simulation, principle audits and analytical oracles",
    packages=find_packages(include=["cfphase", "cfphase.*"]),
    python_requires=">=3.10",
    install_requires=[
        "z3-solver",
        "numpy",
        "scipy",
    ],
    extras_require={
        "test": ["pytest"],
    },
    entry_points={
        "console_scripts": [
            "cfphase = cfphase.cli:main",
        ],
    },
)
