# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

import setuptools


setuptools.setup(
    name="crifem",
    version="0.1.0",
    author="The crifem authors",
    description="Stabilized P1-nonconforming immersed finite elements for planar elasticity interface problems",
    packages=setuptools.find_packages(),
    include_package_data=True,
    classifiers=[
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: Apache Software License",
    ],
    python_requires='>=3.9',
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
        "pandas>=1.4",
    ],
    extras_require={
        "tests": ["pytest>=7"],
    },
    entry_points={
        "console_scripts": [
            "crifem = crifem.cli:main",
        ],
    }
)
