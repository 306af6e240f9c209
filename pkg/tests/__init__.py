"""Test suite for dgcat_workbench."""
