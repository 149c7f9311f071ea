"""
Test package for the FeTS federation simulator
"""
