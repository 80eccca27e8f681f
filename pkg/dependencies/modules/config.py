# -*- coding: utf-8 -*-
r"""
This module reads the curvetop settings: shear budget, approximation
width, worker processes, limit refinements and output format.
Settings and logs are stored in "~/.curvetop", or in the folder named by
the CURVETOP_HOME environment variable. An invalid or incomplete
config.ini is overwritten with the defaults from main.
"""

import os
import configparser
import logging
from dataclasses import dataclass
from sympy import Rational
import main  # noqa

Logger = logging.getLogger(__name__)

OUTPUT_FORMATS: tuple[str, ...] = ('json', 'obj', 'both')


@dataclass(frozen=True)
class Settings:
    shear_budget: int
    refine_width: Rational
    max_processes: int
    limit_refinements: int
    output_format: str


def write_defaults(path: str) -> None:
    """Write the default settings of main to ``path``."""
    config = configparser.ConfigParser()
    config['pipeline'] = {'shear_budget': str(main.SHEAR_BUDGET),
                          'refine_width': main.REFINE_WIDTH,
                          'max_processes': str(main.MAX_PROCESSES),
                          'limit_refinements': str(main.LIMIT_REFINEMENTS)}
    config['output'] = {'format': main.OUTPUT_FORMAT}
    with open(path, 'w', encoding='utf-8') as file:
        config.write(file)


def load_settings(path: str | None = None) -> Settings:
    """
    Read and validate config.ini, writing the defaults first when it is
    missing or invalid.
    :param path: The config file, ``<main_dir>/config.ini`` by default
    :return: The settings
    """
    # Create the necessary folders
    for folder in [main.main_dir, main.logging_dir]:
        if not os.path.exists(folder):
            os.makedirs(folder)
    path = path or os.path.join(main.main_dir, 'config.ini')
    default: bool = main.__DEBUG__

    while True:
        try:
            # If debug mode is on, we explicitly raise a ValueError to
            # write the default settings to the config file
            if default:
                default = False
                raise ValueError

            config = configparser.ConfigParser()
            config.read(path, encoding='utf-8')
            shear_budget = config.getint('pipeline', 'shear_budget')
            refine_width = Rational(config.get('pipeline', 'refine_width'))
            max_processes = config.getint('pipeline', 'max_processes')
            limit_refinements = config.getint('pipeline', 'limit_refinements')
            output_format = config.get('output', 'format')

            # Perform settings check before proceeding
            assert 1 <= shear_budget <= 1000
            assert 0 < refine_width <= 1
            assert 0 <= max_processes <= 16
            assert 8 <= limit_refinements <= 400
            assert output_format in OUTPUT_FORMATS

            Logger.info('config: Settings loaded(%s)', path)
            return Settings(shear_budget, refine_width, max_processes, limit_refinements,
                            output_format)
        except (configparser.NoSectionError, configparser.NoOptionError,
                ValueError, TypeError, AssertionError):
            Logger.info('config: Writing default settings to config file')
            write_defaults(path)
