from setuptools import setup, find_packages

setup(
    name='ncycle_pp',
    version='0.1.0',
    packages=find_packages(exclude=['examples', 'examples.*']),
    install_requires=[
        'loguru',
        'pydantic>=2',
        'pydantic-settings',
        'python-dotenv',
        'numpy',
        'sympy',
    ],
    extras_require={
        'test': ['pytest'],
    },
    entry_points={
        'console_scripts': [
            'ncycle-pp=ncycle_pp.main:main',
        ],
    },
)
