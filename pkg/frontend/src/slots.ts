// Drag-and-drop of generated images into the START/END slots. The payload
// carries the image's prompt, seed, and artifact ref, so dropping copies
// the generation metadata into the slot.

import type { DragPayload } from './state.js';
import { dropIntoSlot, emptySlot, parseDragData } from './state.js';
import type { SlotState } from './state.js';

export const DRAG_MIME = 'application/x-discovid-image';

export const makeDraggable = (img: HTMLElement, payload: DragPayload): void => {
    img.setAttribute('draggable', 'true');
    img.addEventListener('dragstart', (event) => {
        (event as DragEvent).dataTransfer?.setData(DRAG_MIME, JSON.stringify(payload));
    });
};

export const attachSlot = (
    element: HTMLElement,
    which: 'start' | 'end',
    onFilled: (slot: SlotState) => void,
): void => {
    element.addEventListener('dragover', (event) => event.preventDefault());
    element.addEventListener('drop', (event) => {
        event.preventDefault();
        const raw = (event as DragEvent).dataTransfer?.getData(DRAG_MIME) ?? '';
        const slot = dropIntoSlot(emptySlot(which), parseDragData(raw));
        if (slot) {
            onFilled(slot);
        }
    });
};
