"""roomforge: turns scanned room layouts into themed, registered virtual scenes."""

__version__ = "0.1.0"
