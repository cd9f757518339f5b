from setuptools import setup, find_packages

setup(
    name="lllcore",
    version="0.3.0",
    packages=find_packages(include=["lllcore", "lllcore.*"]),
    description="Algorithmic Local Lemma Core - resampling walks, certificates and stable-word tooling",
    author="Toby",
    author_email="toby@example.com",
    python_requires=">=3.8",
    install_requires=[
        "pydantic>=1.8.0",
        "PyYAML>=6.0.1",
        "python-dotenv>=0.19.0",
        "numpy>=1.21.0",
        "scipy>=1.7.0",
        "networkx>=2.6",
    ],
    extras_require={
        "test": [
            "pytest>=7.0.0",
            "pytest-cov>=3.0.0",
            "hypothesis>=6.0.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "lllcore=lllcore.cli:main",
        ],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
    ],
)
