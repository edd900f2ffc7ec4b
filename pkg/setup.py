from setuptools import setup

with open("README.md") as f:
    long_description = f.read()

setup(
    name="slicesla",
    version="0.1.0",
    description="SLA lifecycle, availability penalties and economics for 5G network slices",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=[
        "slicesla",
        "slicesla.base",
        "slicesla.contract",
        "slicesla.lifecycle",
        "slicesla.penalty",
        "slicesla.formats",
    ],
    package_data={"slicesla": ["data/*.yaml"]},
    license="MIT",
    zip_safe=False,
    install_requires=["jsonpatch", "PyYAML", "numpy"],
    python_requires=">=3.8",
    entry_points={"console_scripts": ["slicesla=slicesla.cli:main"]},
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Telecommunications Industry",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
    ],
    keywords="SLA network slicing 5G availability penalty",
)
