from setuptools import setup, find_packages

with open("README.md", encoding="utf8") as f:
    readme = f.read()

setup(
    name="noonsim",
    version="0.1.0",
    install_requires=[
        "numpy",
        "scipy>=1.7",
        "traitlets",
        "python-json-logger",
        "jinja2",
    ],
    python_requires=">=3.7",
    author="noonsim contributors",
    # this should be a whitespace separated string of keywords, not a list
    keywords="quantum optics NOON state beam splitter post-selection",
    description="Simulate NOON-state generation with a beam splitter and post-selection",
    long_description=readme,
    long_description_content_type="text/markdown",
    license="BSD",
    classifiers=[
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: BSD License",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    packages=find_packages(exclude=["tests", "tests.*"]),
    include_package_data=True,
    entry_points={"console_scripts": ["noonsim = noonsim.__main__:main"]},
)
