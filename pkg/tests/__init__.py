"""
Test package for wpduality
"""
