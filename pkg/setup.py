"""Setup configuration for rollscan."""

from setuptools import setup, find_packages

setup(
    name="rollscan",
    version="1.0.0",
    author="rollscan Team",
    description="Rolling-shutter dataset synthesis and detection evaluation toolkit",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.10",
    install_requires=[
        "python-dotenv>=0.19.0",
        "numpy>=1.22",
        "Pillow>=9.1",
    ],
    entry_points={
        "console_scripts": [
            "rollscan=rollscan.cli:main",
        ],
    },
)
