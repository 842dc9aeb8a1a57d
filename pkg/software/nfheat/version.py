# nfheat library and command line version
__version__ = "0.1.0"
