import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name="tlgeom",
    version="1.0.0",
    description="Left-invariant Riemannian geometry of Lie groups and their tangent groups",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=["tlgeom"],
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.8",
    install_requires=["numpy>=1.20", "scipy", "jsonpickle"],
    entry_points={"console_scripts": ["tlgeom = tlgeom.cli:main"]},
)
