"""Code space"""
