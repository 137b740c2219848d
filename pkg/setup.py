import setuptools

setuptools.setup(
    name="densicohom",
    version="1.0.0",
    description="First cohomology of sl(2) with coefficients in multilinear differential "
                "operators on weighted densities",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    license='MIT',
    packages=setuptools.find_packages(include=['densicohom', 'densicohom.*']),
    install_requires=[
        'PyYAML',
        'pyyaml-include<2',
        'progressbar2',
        'pandas',
        'schema',
        'sympy',
    ],
    extras_require={
        'test': ['pytest', 'pytest-mock', 'coverage', 'pytest-cov', 'hypothesis'],
        'doc': ['sphinx', 'sphinx-rtd-theme', 'sphinx-prompt'],
    },
    python_requires=">=3.8",
    entry_points={
        'console_scripts': [
            'densicohom = densicohom.command_line:main',
        ],
    },
)
