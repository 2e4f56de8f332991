from .settings import (
    COMMANDS,
    CONFIG_VERSION,
    DEFAULT_SHOTS,
    ExperimentConfig,
    Settings,
    build_config,
    kappa_grid,
    load_config_file,
    parse_kappas,
)

__all__ = [
    'COMMANDS',
    'CONFIG_VERSION',
    'DEFAULT_SHOTS',
    'ExperimentConfig',
    'Settings',
    'build_config',
    'kappa_grid',
    'load_config_file',
    'parse_kappas',
]
