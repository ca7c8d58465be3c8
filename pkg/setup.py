# setup.py
from setuptools import find_packages, setup

setup(
    name="intersection-forms",
    version="0.1",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=["numpy", "pandas", "pydantic", "python-dotenv", "sympy"],
    entry_points={"console_scripts": ["intersection-forms = frontend.cli:main"]},
)
