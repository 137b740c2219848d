from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional as Opt, Tuple

import yaml
from yamlinclude import YamlIncludeConstructor
from schema import Schema, Or, And, Use, Optional, SchemaError, Regex

from densicohom.exactlin import parse_rational


class Error(Exception):
    """Base class for exceptions in this module."""


class EmptyConfigError(Error):
    """Raised when the configuration file is empty"""


class MissingValueError(Error):
    """Raised when there is a value missing in a configuration file"""


class InvalidValueError(Error):
    """Raised when there is a invalid value in a configuration file"""


@dataclass(frozen=True)
class ScanSpec:
    """
    A sweep over a grid of weights at fixed slot count and shift.

    :param n: number of tensor slots
    :param k: the shift δ = μ - Σλᵢ, a natural number
    :param lambda_grid: one nonempty list of weights per slot
    :param output_format: ``json`` (JSON lines) or ``csv``
    :param output_path: file to write to, standard output when None
    :param log_level: level of the package logger
    :param jobs: number of worker processes
    """
    n: int
    k: int
    lambda_grid: Tuple[Tuple[Fraction, ...], ...]
    output_format: str = 'json'
    output_path: Opt[Path] = None
    log_level: str = 'info'
    jobs: int = 1

    def __post_init__(self):
        ConfigParser.check_grid({'n': self.n, 'lambda_grid': self.lambda_grid})

    @property
    def points(self) -> List[Tuple[Fraction, ...]]:
        """The grid points, slot 1 outermost."""
        points = [()]
        for values in self.lambda_grid:
            points = [point + (value,) for point in points for value in values]
        return points


class SchemaParser:
    """
    Class which handles all schema logic.
    """
    rational_pattern = Regex(r'^\s*[+-]?\d+(/\d+)?\s*$',
                             error="Error in rational: '{}', use an integer or p/q (no decimals)")

    rational = Schema(
        Or(
            And(int, Schema(lambda i: not isinstance(i, bool), error="'{}' is not a rational."),
                Use(Fraction)),
            And(str, rational_pattern, Use(parse_rational)),
            error="Weights must be integers or strings p/q, decimals are not accepted."
        )
    )

    @staticmethod
    def path_schema(data: dict, config_path: Path) -> dict:
        """
        Makes :code:`output_path` absolute, relative to the folder of the config file.

        :param data: data from the config file
        :type data: dict
        :param config_path: path to the config file
        :type config_path: Path

        :return: the config data, with an absolute output path if one is given
        :rtype: dict
        """
        return Schema(
            {
                Optional('output_path'): And(
                    Use(str, error="'output_path' should be a string."),
                    Use(Path),
                    Use(lambda p: config_path.absolute().parent / p),
                ),
                str: object
            }
        ).validate(data)

    @staticmethod
    def validate_schema(data: dict) -> dict:
        """
        Apply a schema to the data. This schema makes sure that every required parameter is given.
        It also fills in default values for missing parameters, converts weights to exact
        rationals and lower-cases :code:`format` and :code:`log_level`.

        :param data: data from the config file
        :type data: dict

        :return: A verified version of the data of the config file
        :rtype: dict
        """
        config_schema = Schema({
            'n': And(
                int,
                Schema(lambda i: i >= 1, error="'n' must be positive.")),
            'k': And(
                int,
                Schema(lambda i: i >= 0, error="'k' must be a natural number.")),
            'lambda_grid': [[SchemaParser.rational]],
            Optional('format', default='json'): And(
                str,
                Use(str.lower),
                Or('json', 'csv', error="'format' should be one of the following: 'json' or 'csv'.")),
            Optional('output_path'): Path,
            Optional('log_level', default='info'): And(
                str,
                Use(str.lower),
                Or('debug', 'info', 'warning', 'error', 'critical', error="'log_level' should be "
                                                                          "one of the following: "
                                                                          "'debug', 'info', 'warning', "
                                                                          "'error' or 'critical'.")),
            Optional('jobs', default=1): And(
                int,
                Schema(lambda i: i > 0, error="'jobs' must be positive.")),
        })

        return config_schema.validate(data)


class ConfigParser:
    """
    Class handling the parsing of a scan configuration.

    :param config_path: The path to the scan config file in yaml format
    :type config_path: Path
    """

    def __init__(self, config_path: Path):
        self.config_path = config_path.absolute()

        YamlIncludeConstructor.add_to_loader_class(loader_class=yaml.FullLoader,
                                                   base_dir=self.config_path.parent)

        try:
            self.data = self.apply_schema(self.config_path)
        except SchemaError as exc:
            raise InvalidValueError(exc.code) from exc

        self.do_checks(self.data)

    @staticmethod
    def do_checks(data: dict):
        """
        Perform the checks across keys that the schema cannot express.

        :param data: The data to check
        """
        ConfigParser.check_grid(data)

    @staticmethod
    def check_grid(data: dict):
        """
        Check that the grid has one nonempty list of weights per slot.

        :param data: the data to check on
        :raise MissingValueError: when a slot has no weights
        :raise InvalidValueError: when the number of slot lists differs from n
        """
        grid = data['lambda_grid']
        if len(grid) != data['n']:
            raise InvalidValueError("'lambda_grid' has {m} slot lists, expected n = {n}."
                                    .format(m=len(grid), n=data['n']))
        for slot, values in enumerate(grid, start=1):
            if len(values) == 0:
                raise MissingValueError("Slot {i} of 'lambda_grid' has no weights.".format(i=slot))

    @staticmethod
    def apply_schema(config_path: Path) -> dict:
        """
        Load the yaml data from the config file, and apply the schema.

        :param config_path: The path to the config file
        :type config_path: Path

        :return: A verified version of the data of the config file
        :rtype: dict
        """
        data = ConfigParser.load_yaml(config_path)
        if not data:
            raise EmptyConfigError("Config file {p} is empty.".format(p=config_path))
        data = SchemaParser.path_schema(data, config_path)
        return SchemaParser.validate_schema(data)

    @staticmethod
    def load_yaml(path: Path) -> dict:
        """
        Uses :code:`pyyaml` and :code:`pyyaml-include` to read in a yaml file.
        This means you can use '!include' to include yaml files in other yaml files.

        :param path: path to the yaml file to be loaded.
        :type path: Path
        :return: a dict representing the yaml file
        :rtype: dict
        :raise MissingValueError: when the file does not exist
        """
        try:
            with path.open(mode='r') as file:
                return yaml.load(file, Loader=yaml.FullLoader)
        except FileNotFoundError as exc:
            raise MissingValueError("File not found: {f}".format(f=exc.filename)) from exc

    def scan_spec(self) -> ScanSpec:
        """The validated configuration as a :class:`ScanSpec`."""
        return ScanSpec(
            n=self.data['n'],
            k=self.data['k'],
            lambda_grid=tuple(tuple(values) for values in self.data['lambda_grid']),
            output_format=self.data['format'],
            output_path=self.data.get('output_path'),
            log_level=self.data['log_level'],
            jobs=self.data['jobs'],
        )
