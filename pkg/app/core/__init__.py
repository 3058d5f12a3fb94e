"""Core utilities and configuration."""