"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

from abc import ABC, abstractmethod


class ScenarioParseError(ValueError):
    """Malformed scenario file.

    Attributes
    ----------
    line : int or None
        1-based line number (text files), None when not applicable
    field : str or None
        header key, section or attribute that failed to parse
    """

    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f'line {line}')
        if field is not None:
            where.append(f'field {field!r}')
        super().__init__(f'{message} ({", ".join(where)})' if where else message)
        self.line = line
        self.field = field


class ScenarioFile(ABC):
    """ Abstract class representing one Scenario stored on disk.

    Classes for different file formats should inherit from this class.

    The `scenario` property parses the file on first access. `write` is the
    inverse: writing a loaded scenario back reproduces the same content.
    """

    format_name = None

    @property
    def scenario(self):
        if self._scenario is None:
            self.load_scenario()
        return self._scenario

    @property
    def format(self):
        return self.format_name

    def __init__(self, path):
        """ Construct a ScenarioFile object

        Parameters
        ----------
        path : str or Path
            location of the scenario file
        """

        self.path = path
        self._scenario = None

    @abstractmethod
    def load_scenario(self):
        pass

    @staticmethod
    @abstractmethod
    def detect_format(path):
        """Return True if the file at `path` is in this format"""
        pass

    @staticmethod
    @abstractmethod
    def write(scenario, path):
        """Write `scenario` to `path` in this format"""
        pass

    def __str__(self):
        """Returns a string with information about the scenario file"""

        return f'{self.path} ({self.format} format)'
