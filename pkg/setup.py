from setuptools import setup, find_packages

setup(
    name='msc-coin-tools',
    version='0.1',
    packages=find_packages(exclude=['test']),
    install_requires=['netcdf4', 'numpy', 'scipy>=1.4', 'xarray', 'pandas>=1.5'],
    entry_points={'console_scripts': ['msc-coin-tools=msc_coin_tools.cli:main']},
    license='BSD-3',
)
