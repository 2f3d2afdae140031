import setuptools

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setuptools.setup(
    name="lorentzlab",
    version="0.1.0",
    description="Numerical Lorentz and Sobolev-Lorentz norms, a gallery of extremal functions and inequality checks.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(include=['lorentzlab', 'lorentzlab.*']),
    install_requires=['numpy', 'scipy', 'pandas>=1.5', 'joblib', 'tqdm', 'dill', 'pytest'],
    entry_points={'console_scripts': ['lorentzlab=lorentzlab.cli:main']},
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    python_requires='>=3.8',
)
