from setuptools import find_packages, setup

with open("requirements.txt") as f:
    requirements = f.read().splitlines()

setup(
    name="fflab",
    author="fflab contributors",
    version="0.3.0",
    description="Computational lab for restriction, energy and Kakeya estimates over finite fields",
    packages=find_packages(exclude=("test*",)),
    license="MIT",
    python_requires=">=3.9.0",
    install_requires=requirements,
    package_data={"fflab": ["py.typed"], "fflab.harness": ["templates/*.j2", "templates/*.fmt"]},
    entry_points={"console_scripts": ["fflab = fflab.harness.cli:main"]},
)
