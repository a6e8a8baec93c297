"""Configuration package"""

