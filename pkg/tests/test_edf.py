"""EDF binary round-trips, header validation, and summary parsing."""

import datetime

import numpy as np
import pytest

from seizurekit import (
    ChannelMeta,
    EdfCalibrationError,
    EdfParseError,
    EdfRangeError,
    Recording,
    SummaryError,
    parse_edf,
    parse_seizure_summary,
    write_edf,
)


def make_channel(label="EEG F3", spr=4, pmin=-100.0, pmax=100.0):
    return ChannelMeta(
        label=label,
        transducer="AgAgCl electrode",
        physical_dimension="uV",
        physical_min=pmin,
        physical_max=pmax,
        digital_min=-32768,
        digital_max=32767,
        prefiltering="HP:0.1Hz",
        samples_per_record=spr,
    )


def make_recording(channels, signals, num_records):
    return Recording(
        patient_id="chb01",
        start_datetime=datetime.datetime(2002, 3, 4, 5, 6, 7),
        record_duration_s=1.0,
        num_records=num_records,
        channels=tuple(channels),
        signals=tuple(signals),
        recording_id="Startdate 04-MAR-2002",
    )


def test_file_layout_sizes():
    ch = make_channel(spr=4)
    rec = make_recording([ch], [np.zeros(8)], 2)
    raw = write_edf(rec)
    # 256 fixed header + 256 per signal + 2 records x 4 samples x 2 bytes
    assert len(raw) == 256 + 256 + 2 * 4 * 2
    assert raw[:8] == b"0" + b" " * 7
    assert raw[168:176] == b"04.03.02"
    assert raw[176:184] == b"05.06.07"


def test_calibration_maps_digital_zero():
    # gain = 200 / 65535; digital 0 sits 32768 steps above -100
    ch = make_channel()
    value = ch.physical_min + (0 - ch.digital_min) * ch.gain
    assert round(value, 7) == 0.0015259


def test_calibration_endpoints_exact():
    ch = make_channel()
    assert ch.physical_min + (ch.digital_min - ch.digital_min) * ch.gain == -100.0
    assert ch.physical_min + (ch.digital_max - ch.digital_min) * ch.gain == 100.0


def test_round_trip_preserves_headers_and_samples():
    rng = np.random.default_rng(42)
    ch1 = make_channel("EEG F3", spr=8)
    ch2 = make_channel("EEG C4", spr=4, pmin=-500.0, pmax=500.0)
    sig1 = rng.uniform(-99, 99, size=8 * 5)
    sig2 = rng.uniform(-499, 499, size=4 * 5)
    rec = make_recording([ch1, ch2], [sig1, sig2], 5)
    back = parse_edf(write_edf(rec))

    assert back.patient_id == rec.patient_id
    assert back.recording_id == rec.recording_id
    assert back.start_datetime == rec.start_datetime
    assert back.num_records == 5
    assert back.record_duration_s == 1.0
    for orig, parsed in zip(rec.channels, back.channels):
        assert parsed == orig
    for meta, orig, parsed in zip(rec.channels, rec.signals, back.signals):
        assert np.abs(parsed - orig).max() <= meta.gain / 2 + 1e-12


def test_round_trip_many_random_recordings():
    rng = np.random.default_rng(7)
    for trial in range(30):
        n_sig = int(rng.integers(1, 4))
        spr = int(rng.integers(2, 17))
        n_rec = int(rng.integers(1, 6))
        channels = []
        signals = []
        for i in range(n_sig):
            lo = float(rng.integers(-500, -10))
            hi = float(rng.integers(10, 500))
            channels.append(make_channel(f"CH{i}", spr=spr, pmin=lo, pmax=hi))
            signals.append(rng.uniform(lo, hi, size=spr * n_rec))
        rec = make_recording(channels, signals, n_rec)
        back = parse_edf(write_edf(rec))
        assert back.channels == rec.channels
        for meta, orig, parsed in zip(channels, signals, back.signals):
            assert np.abs(parsed - orig).max() <= meta.gain / 2 + 1e-12


def test_unknown_record_count_recovered_from_length():
    ch = make_channel(spr=4)
    rec = make_recording([ch], [np.zeros(12)], 3)
    raw = bytearray(write_edf(rec))
    raw[236:244] = b"-1".ljust(8)
    back = parse_edf(bytes(raw))
    assert back.num_records == 3


def test_unknown_record_count_with_ragged_data_rejected():
    ch = make_channel(spr=4)
    rec = make_recording([ch], [np.zeros(12)], 3)
    raw = bytearray(write_edf(rec))
    raw[236:244] = b"-1".ljust(8)
    with pytest.raises(EdfParseError):
        parse_edf(bytes(raw[:-2]))  # drop 2 bytes: no longer tiles


def test_truncated_header_rejected_with_offset():
    with pytest.raises(EdfParseError) as err:
        parse_edf(b"0" + b" " * 100)
    assert err.value.offset == 101


def test_non_ascii_header_byte_rejected():
    ch = make_channel(spr=2)
    raw = bytearray(write_edf(make_recording([ch], [np.zeros(2)], 1)))
    raw[20] = 0xFF  # inside patient_id
    with pytest.raises(EdfParseError):
        parse_edf(bytes(raw))


def test_header_bytes_mismatch_rejected():
    ch = make_channel(spr=2)
    raw = bytearray(write_edf(make_recording([ch], [np.zeros(2)], 1)))
    raw[184:192] = b"999".ljust(8)
    with pytest.raises(EdfParseError):
        parse_edf(bytes(raw))


def test_truncated_data_records_rejected():
    ch = make_channel(spr=4)
    raw = write_edf(make_recording([ch], [np.zeros(8)], 2))
    with pytest.raises(EdfParseError):
        parse_edf(raw[:-4])


def test_year_pivot():
    ch = make_channel(spr=2)
    for year, text in ((1985, b"85"), (1999, b"99"), (2000, b"00"), (2084, b"84")):
        rec = Recording(
            patient_id="x",
            start_datetime=datetime.datetime(year, 1, 2, 3, 4, 5),
            record_duration_s=1.0,
            num_records=1,
            channels=(ch,),
            signals=(np.zeros(2),),
        )
        raw = write_edf(rec)
        assert raw[174:176] == text
        assert parse_edf(raw).start_datetime.year == year


def test_out_of_range_sample_names_channel_and_index():
    ch = make_channel(spr=4)
    sig = np.zeros(4)
    sig[2] = 150.0  # beyond physical_max 100
    with pytest.raises(EdfRangeError) as err:
        write_edf(make_recording([ch], [sig], 1))
    assert "EEG F3" in str(err.value)
    assert "2" in str(err.value)


def test_bad_digital_range_rejected():
    with pytest.raises(EdfCalibrationError):
        ChannelMeta("x", "", "uV", -1.0, 1.0, 5, 5, "", 4)


def test_flat_physical_range_rejected():
    with pytest.raises(EdfCalibrationError):
        ChannelMeta("x", "", "uV", 3.0, 3.0, -10, 10, "", 4)


def test_unencodable_header_number_rejected():
    # 17 significant digits cannot fit an 8-character field losslessly
    ch = ChannelMeta("x", "", "uV", -0.12345678901234567, 1.0, -10, 10, "", 2)
    with pytest.raises(ValueError):
        write_edf(make_recording([ch], [np.zeros(2)], 1))


def test_summary_with_numbered_and_plain_seizure_lines():
    text = """Data Sampling Rate: 256 Hz
Channel 1: FP1-F7

File Name: chb01_03.edf
Number of Seizures in File: 1
Seizure Start Time: 2996 seconds
Seizure End Time: 3036 seconds

File Name: chb01_04.edf
Number of Seizures in File: 2
Seizure 1 Start Time: 10 seconds
Seizure 1 End Time: 20 seconds
Seizure 2 Start Time: 100 seconds
Seizure 2 End Time: 120 seconds

File Name: chb01_05.edf
Number of Seizures in File: 0
"""
    result = parse_seizure_summary(text)
    assert list(result) == ["chb01_03.edf", "chb01_04.edf", "chb01_05.edf"]
    assert [(iv.start_s, iv.end_s) for iv in result["chb01_03.edf"]] == [(2996.0, 3036.0)]
    assert [(iv.start_s, iv.end_s) for iv in result["chb01_04.edf"]] == [
        (10.0, 20.0),
        (100.0, 120.0),
    ]
    assert result["chb01_05.edf"] == []


def test_summary_count_mismatch_rejected():
    text = """File Name: a.edf
Number of Seizures in File: 2
Seizure Start Time: 10 seconds
Seizure End Time: 20 seconds
"""
    with pytest.raises(SummaryError):
        parse_seizure_summary(text)


def test_summary_end_before_start_rejected():
    text = """File Name: a.edf
Number of Seizures in File: 1
Seizure Start Time: 30 seconds
Seizure End Time: 20 seconds
"""
    with pytest.raises(SummaryError):
        parse_seizure_summary(text)


def test_summary_orphan_seizure_line_rejected():
    with pytest.raises(SummaryError):
        parse_seizure_summary("Seizure Start Time: 10 seconds\n")


def test_summary_dangling_start_rejected():
    text = """File Name: a.edf
Number of Seizures in File: 1
Seizure Start Time: 10 seconds
"""
    with pytest.raises(SummaryError):
        parse_seizure_summary(text)
