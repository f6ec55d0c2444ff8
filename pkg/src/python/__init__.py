"""Init file for src python"""
