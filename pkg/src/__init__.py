"""Init file for src root"""
