"""Default settings stored in ``configuration.ini`` next to this file."""

import configparser
import os
from dataclasses import dataclass

from pythrs.errors import PreconditionError


class Configuration():
    DefaultDic = {'tolerances': {'absolute': 1e-12,
                                 'relative': 1e-9,
                                 'normalization': 1e-10,
                                 'identity': 1e-10,
                                 'null_cube': 1e-6},
                  'axioms': {'sample_budget': 1000,
                             'seed': 0},
                  'generator': {'weight_low': 0.5,
                                'weight_high': 2.0,
                                'diagonal_low': -2.0,
                                'diagonal_high': 2.0},
                  'optimizer': {'restarts': 64,
                                'max_iterations': 500,
                                'initial_step': 0.1,
                                'shrink': 0.5,
                                'convergence': 1e-12,
                                'fd_step': 1e-6,
                                'delta_floor': 1e-9,
                                'lhs_floor': 1e-9,
                                'falsify_tol': 1e-6,
                                'workers': 1}}

    def __init__(self, path: str | None = None) -> None:
        dirname = os.path.dirname(__file__)
        self.path = path or os.path.join(dirname, 'configuration.ini')

    def save_defaults(self, Dic=DefaultDic) -> None:
        config = configparser.ConfigParser()
        config.read_dict(Dic)
        with open(self.path, 'w') as configfile:
            config.write(configfile)

    def load(self) -> configparser.ConfigParser:
        """Read the INI file on top of the built-in defaults.

        Missing files or keys fall back to ``DefaultDic``.
        """
        config = configparser.ConfigParser()
        config.read_dict(self.DefaultDic)
        config.read(self.path)
        return config


@dataclass(frozen=True)
class Tolerances:
    """Absolute floor plus a relative term scaled by the magnitudes involved."""

    absolute: float = 1e-12
    relative: float = 1e-9

    def __post_init__(self) -> None:
        if not (self.absolute >= 0 and self.relative >= 0):
            raise PreconditionError("tolerances must be non-negative")

    def bound(self, scale: float) -> float:
        return self.absolute + self.relative * abs(scale)

    @classmethod
    def from_config(cls, config: configparser.ConfigParser) -> "Tolerances":
        section = config['tolerances']
        return cls(absolute=section.getfloat('absolute'),
                   relative=section.getfloat('relative'))
