# -*- coding: utf-8 -*-
"""Shared fixtures: the repository root on sys.path, a parsing helper and an isolated app folder."""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from curvetop import parse_polynomial  # noqa PEP 8: E402


@pytest.fixture
def poly():
    return parse_polynomial


@pytest.fixture
def app_home(tmp_path, monkeypatch):
    """Point main's folders at a temporary directory."""
    import main
    home = tmp_path / 'home'
    monkeypatch.setattr(main, 'main_dir', str(home))
    monkeypatch.setattr(main, 'logging_dir', str(home / 'logs'))
    return home
