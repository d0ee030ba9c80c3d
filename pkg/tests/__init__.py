"""Test suite for the transfer-phase package"""
