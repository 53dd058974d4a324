from setuptools import setup, find_packages

setup(
    name="maxcut_game",
    version="0.1.0",
    package_dir={"": "maxcut_game/src"},
    packages=find_packages(where="maxcut_game/src"),
    install_requires=[
        "numpy>=1.24",
        "networkx>=3.0",
        "sortedcontainers>=2.4.0",
        "PyYAML>=6.0",
        "tqdm>=4.60",
        "psutil>=5.9",
    ],
    entry_points={"console_scripts": ["maxcut-game=maxcut_game.experiments.cli:main"]},
    description="Exact engine for the max k-cut game with strong-equilibrium verification",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.10",
)
