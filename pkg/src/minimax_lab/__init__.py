"""Zero-sum game dynamics and Fictitious GAN training at desk scale."""

__version__ = "0.1.0"
