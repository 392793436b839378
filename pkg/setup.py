import os

from setuptools import find_packages, setup

here = os.path.dirname(os.path.abspath(__file__))


def get_lookup():
    """
    Execute hytrans/version.py without importing the package (its
    dependencies may not be installed yet).
    """
    lookup = {}
    with open(os.path.join(here, "hytrans", "version.py")) as fd:
        exec(fd.read(), lookup)
    return lookup


def get_reqs(lookup, key="INSTALL_REQUIRES"):
    """
    Requirement strings from a tuple of (name, {"min_version"|"exact_version"}).
    """
    reqs = []
    for name, meta in lookup[key]:
        if meta.get("exact_version"):
            reqs.append(f"{name}=={meta['exact_version']}")
        elif meta.get("min_version"):
            reqs.append(f"{name}>={meta['min_version']}")
        else:
            reqs.append(name)
    return reqs


def get_long_description(lookup):
    try:
        with open(os.path.join(here, "README.md")) as fd:
            return fd.read()
    except OSError:
        return lookup["DESCRIPTION"]


if __name__ == "__main__":
    lookup = get_lookup()
    tests_requires = get_reqs(lookup, "TESTS_REQUIRES")

    setup(
        name=lookup["NAME"],
        version=lookup["__version__"],
        author=lookup["AUTHOR"],
        author_email=lookup["EMAIL"],
        packages=find_packages(),
        package_data={"hytrans": ["data/*.json"]},
        include_package_data=True,
        zip_safe=False,
        license=lookup["LICENSE"],
        description=lookup["DESCRIPTION"],
        long_description=get_long_description(lookup),
        long_description_content_type="text/markdown",
        keywords=lookup["KEYWORDS"],
        python_requires=">=3.8",
        install_requires=get_reqs(lookup),
        tests_require=tests_requires,
        extras_require={
            "all": get_reqs(lookup, "INSTALL_REQUIRES_ALL"),
            "tests": tests_requires,
        },
        entry_points={"console_scripts": ["hytrans=hytrans.cli:main"]},
        classifiers=[
            "Intended Audience :: Science/Research",
            "License :: OSI Approved :: Apache Software License",
            "Topic :: Scientific/Engineering :: Physics",
            "Operating System :: Unix",
            "Programming Language :: Python :: 3 :: Only",
        ],
    )
