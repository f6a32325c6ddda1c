"""
Test suite for the netflation project.
"""
