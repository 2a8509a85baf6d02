"""Tests package for the ZAGFF toolkit."""
