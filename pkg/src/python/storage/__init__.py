"""Init file for src python storage"""
