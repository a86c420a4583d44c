from setuptools import setup, find_packages

setup(
    name="strongprop",
    version="0.1.0",
    description="Exact decision and construction of connected strongly-proportional cake divisions in the Robertson-Webb query model.",
    packages=find_packages(include=['src', 'src.*']),
    py_modules=['main'],
    python_requires=">=3.8",
    install_requires=[
        "numpy",
        "pyyaml",
        "python-dotenv",
    ],
    extras_require={
        "test": ["pytest", "hypothesis"],
    },
    entry_points={
        "console_scripts": [
            "strongprop=main:main",
        ],
    },
)
