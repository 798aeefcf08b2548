from setuptools import setup, find_packages

setup(
    name="silver_bullet",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    install_requires=[
        "pydantic>=2.0.0",
        "python-dotenv>=1.0.0",
        "numpy>=1.21.0",
        "pandas>=2.0.0",  # CSV output of design-space sweeps
        "tqdm>=4.65.0",  # Progress on fuzz batches
    ],
    extras_require={
        'dev': [
            'pytest>=7.0.0',
            'hypothesis>=6.80.0',
        ],
    },
    entry_points={
        'console_scripts': [
            'silver-bullet=silver_bullet.main:main',
        ],
    },
    description="Analytical model, simulator and attack synthesis for the Silver Bullet RowHammer mitigation",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: System :: Hardware",
        "Topic :: Security",
    ],
    python_requires=">=3.9",
    include_package_data=True,
    zip_safe=False,
)
