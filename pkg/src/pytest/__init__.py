"""Init file for src pytest"""
