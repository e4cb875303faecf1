// DOM wiring: binds the view-model, API client, offline queue, and zoom
// math to the page. Charts come from the server as SVG; taps on the
// stable point ids drive the inspection panel.

import { ApiClient, ApiError } from './api.js';
import { validatePatient, validateVisit } from './forms.js';
import { OfflineQueue, BrowserStorage } from './queue.js';
import { AppState } from './state.js';
import type { Indicator } from './types.js';
import { INDICATORS } from './types.js';
import {
    ViewBox,
    magnification,
    pan,
    parseViewBox,
    reset,
    viewBoxAttr,
    zoomAt,
} from './zoom.js';

const api = new ApiClient('');
const queue = new OfflineQueue(new BrowserStorage());
const state = new AppState();

const $ = <T extends HTMLElement>(id: string): T => document.getElementById(id) as T;

let fullViewBox: ViewBox | null = null;
let chartEpoch = 0;

function isOfflineError(err: unknown): boolean {
    return !(err instanceof ApiError);
}

async function refreshPatients(selectId?: string): Promise<void> {
    try {
        state.setPatients(await api.listPatients());
    } catch {
        // offline: keep whatever we have
    }
    if (selectId) state.selectPatient(selectId);
}

async function loadChart(): Promise<void> {
    const key = state.chartKey();
    const host = $('chart-host');
    if (!key) {
        host.innerHTML = '<p class="empty">Select a child to see their charts.</p>';
        return;
    }
    const epoch = ++chartEpoch;
    try {
        const [svg, chart] = await Promise.all([
            api.chartSvg(key.patientId, key.indicator, key.palette),
            api.chart(key.patientId, key.indicator, key.palette),
        ]);
        if (epoch !== chartEpoch) return; // a newer tab/patient load superseded this one
        host.innerHTML = svg;
        state.chartLoaded(chart);
        wireChartInteractions();
    } catch (err) {
        if (err instanceof ApiError && err.status === 404) {
            host.innerHTML = `<p class="empty">No ${key.indicator} reference table on this server.</p>`;
        } else if (err instanceof ApiError) {
            host.innerHTML = `<p class="empty">${err.reason}</p>`;
        } else {
            host.innerHTML = '<p class="empty">Offline: chart unavailable.</p>';
        }
        state.chartLoaded({ dataset_id: '', palette: key.palette, spec: null, warnings: [], annotations: [] });
    }
}

function chartSvg(): SVGSVGElement | null {
    return $('chart-host').querySelector('svg');
}

function wireChartInteractions(): void {
    const svg = chartSvg();
    if (!svg) return;
    fullViewBox = parseViewBox(svg.getAttribute('viewBox') ?? '0 0 900 620');

    svg.addEventListener('click', (ev) => {
        const target = ev.target as Element;
        const point = target.closest('.point');
        if (point && point.id) {
            const match = point.id.match(/point-(\d+)$/);
            state.inspectPoint(match ? Number(match[1]) : null);
        } else {
            state.inspectPoint(null);
        }
    });

    svg.addEventListener('wheel', (ev) => {
        ev.preventDefault();
        if (!fullViewBox) return;
        const vb = parseViewBox(svg.getAttribute('viewBox')!);
        const rect = svg.getBoundingClientRect();
        const cx = vb.x + ((ev.clientX - rect.left) / rect.width) * vb.w;
        const cy = vb.y + ((ev.clientY - rect.top) / rect.height) * vb.h;
        const factor = ev.deltaY < 0 ? 1.25 : 0.8;
        svg.setAttribute('viewBox', viewBoxAttr(zoomAt(vb, fullViewBox, factor, cx, cy)));
        updateZoomBadge(svg);
    }, { passive: false });

    let dragFrom: { x: number; y: number } | null = null;
    svg.addEventListener('pointerdown', (ev) => {
        dragFrom = { x: ev.clientX, y: ev.clientY };
        svg.setPointerCapture(ev.pointerId);
    });
    svg.addEventListener('pointermove', (ev) => {
        if (!dragFrom || !fullViewBox) return;
        const rect = svg.getBoundingClientRect();
        const vb = parseViewBox(svg.getAttribute('viewBox')!);
        const dx = (dragFrom.x - ev.clientX) / rect.width;
        const dy = (dragFrom.y - ev.clientY) / rect.height;
        svg.setAttribute('viewBox', viewBoxAttr(pan(vb, fullViewBox, dx, dy)));
        dragFrom = { x: ev.clientX, y: ev.clientY };
    });
    svg.addEventListener('pointerup', () => {
        dragFrom = null;
    });

    svg.addEventListener('dblclick', () => {
        if (!fullViewBox) return;
        svg.setAttribute('viewBox', viewBoxAttr(reset(fullViewBox)));
        updateZoomBadge(svg);
    });
    updateZoomBadge(svg);
}

function updateZoomBadge(svg: SVGSVGElement): void {
    if (!fullViewBox) return;
    const zoom = magnification(parseViewBox(svg.getAttribute('viewBox')!), fullViewBox);
    $('zoom-badge').textContent = zoom > 1.01 ? `${zoom.toFixed(1)}x (double-tap to reset)` : '';
}

async function loadRecommendation(): Promise<void> {
    const pid = state.selectedPatientId;
    if (!pid) {
        state.recommendationLoaded(null);
        return;
    }
    try {
        state.recommendationLoaded(await api.recommendation(pid));
    } catch {
        state.recommendationLoaded(null); // offline or server error: hide
    }
}

async function drainOutbox(): Promise<void> {
    const result = await queue.drain(api);
    state.setPendingCount(result.remaining);
    if (result.sent > 0) {
        await refreshPatients(state.selectedPatientId ?? undefined);
        await loadChart();
        await loadRecommendation();
    }
}

// -- rendering ---------------------------------------------------------------

function render(): void {
    const select = $<HTMLSelectElement>('patient-select');
    const current = state.selectedPatientId ?? '';
    select.innerHTML =
        '<option value="">— select child —</option>' +
        state.patients
            .map((p) => `<option value="${p.id}" ${p.id === current ? 'selected' : ''}>${p.name}</option>`)
            .join('');

    for (const indicator of INDICATORS) {
        const button = $(`tab-${indicator}`);
        button.classList.toggle('active', state.activeTab === indicator);
    }

    const badge = $('pending-badge');
    badge.textContent = state.pendingCount > 0 ? `${state.pendingCount} pending sync` : '';
    badge.classList.toggle('visible', state.pendingCount > 0);

    const panel = $('inspect-panel');
    if (state.inspected) {
        const m = state.inspected;
        panel.classList.add('visible');
        panel.innerHTML =
            `<h3>Visit ${m.visitDate}</h3><dl>` +
            m.fields.map((f) => `<dt>${f.label}</dt><dd>${f.value}</dd>`).join('') +
            `<dt>z-score</dt><dd class="zone-${m.zone ?? 'none'}">${m.zDisplay}</dd>` +
            `<dt>RUTF rations</dt><dd>${m.rutf}</dd></dl>`;
    } else {
        panel.classList.remove('visible');
        panel.innerHTML = '<p class="hint">Tap a data point to inspect it.</p>';
    }

    const banner = $('recommendation-banner');
    const rec = state.recommendation;
    if (!rec) {
        banner.className = 'banner hidden';
        banner.innerHTML = '';
    } else if (rec.program === 'NONE') {
        banner.className = 'banner neutral';
        banner.innerHTML = '<strong>No program indicated</strong> by the latest visit.';
    } else {
        banner.className = `banner ${rec.program.toLowerCase()}`;
        banner.innerHTML =
            `<strong>${rec.program} suggested</strong> — ${rec.reasons.join('; ')}` +
            `<br><small>${rec.advisory}</small>`;
    }

    const visitForm = $('visit-form');
    visitForm.classList.toggle('hidden', !state.selectedPatientId);
}

// -- event wiring --------------------------------------------------------------

function wireForms(): void {
    $('patient-select').addEventListener('change', async (ev) => {
        const id = (ev.target as HTMLSelectElement).value || null;
        state.selectPatient(id);
        await loadChart();
        await loadRecommendation();
    });

    for (const indicator of INDICATORS) {
        $(`tab-${indicator}`).addEventListener('click', async () => {
            state.setTab(indicator as Indicator);
            await loadChart();
        });
    }

    $<HTMLSelectElement>('palette-select').addEventListener('change', async (ev) => {
        state.setPalette((ev.target as HTMLSelectElement).value);
        await loadChart();
    });

    $('patient-form').addEventListener('submit', async (ev) => {
        ev.preventDefault();
        const form = {
            name: $<HTMLInputElement>('patient-name').value,
            sex: $<HTMLSelectElement>('patient-sex').value,
            birth_date: $<HTMLInputElement>('patient-birth').value,
        };
        const errors = validatePatient(form);
        $('patient-errors').textContent = errors.join('; ');
        if (errors.length > 0) return;
        const record = { id: crypto.randomUUID(), ...form } as never;
        try {
            const created = await api.createPatient(record);
            await refreshPatients(created.id);
        } catch (err) {
            if (!isOfflineError(err)) throw err;
            queue.enqueuePatient(record);
            state.patients.push(record);
            state.selectPatient((record as { id: string }).id);
            state.setPendingCount(queue.size);
        }
        ($('patient-form') as HTMLFormElement).reset();
        await loadChart();
    });

    $('visit-form').addEventListener('submit', async (ev) => {
        ev.preventDefault();
        const patient = state.selectedPatient;
        if (!patient) return;
        const form = {
            date: $<HTMLInputElement>('visit-date').value,
            weight: $<HTMLInputElement>('visit-weight').value,
            height: $<HTMLInputElement>('visit-height').value,
            muac: $<HTMLInputElement>('visit-muac').value,
            oedema: $<HTMLSelectElement>('visit-oedema').value,
            note: $<HTMLInputElement>('visit-note').value,
        };
        const { errors, visit } = validateVisit(form, patient.birth_date);
        $('visit-errors').textContent = errors.join('; ');
        if (!visit) return;
        const record = { id: crypto.randomUUID(), ...visit };
        try {
            await api.addVisit(patient.id, record);
        } catch (err) {
            if (!isOfflineError(err)) {
                $('visit-errors').textContent = (err as ApiError).reason;
                return;
            }
            queue.enqueueVisit(patient.id, record);
            state.setPendingCount(queue.size);
        }
        ($('visit-form') as HTMLFormElement).reset();
        await loadChart();
        await loadRecommendation();
    });

    $('sync-button').addEventListener('click', () => void drainOutbox());
    window.addEventListener('online', () => void drainOutbox());
}

async function start(): Promise<void> {
    state.subscribe(render);
    wireForms();
    state.setPendingCount(queue.size);
    await refreshPatients();
    render();
    if (navigator.onLine) await drainOutbox();
}

void start();
